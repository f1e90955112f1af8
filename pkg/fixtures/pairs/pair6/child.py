import rospy
import smach

from robot_skills.head import MoveHead
from robot_skills.learning import LearnPerson
from robot_skills.speech import Say


class LearnOperator(smach.StateMachine):
    """Teach the robot the face of the operator in front of it."""

    def __init__(self, robot, operator_designator):
        smach.StateMachine.__init__(self, outcomes=['succeeded', 'failed'])
        self.robot = robot
        with self:
            smach.StateMachine.add('SAY_START',
                                   Say(robot, 'Please look at me while I learn your face.'),
                                   transitions={'spoken': 'MOVE_HEAD'})

            smach.StateMachine.add('MOVE_HEAD',
                                   MoveHead(robot, 'operator_face'),
                                   transitions={'head_at_goal': 'LEARN_PERSON',
                                                'cancelled': 'failed'})

            smach.StateMachine.add('LEARN_PERSON',
                                   LearnPerson(robot, operator_designator),
                                   transitions={'succeeded_learning': 'SAY_DONE',
                                                'failed_learning': 'FAILED'})

            smach.StateMachine.add('SAY_DONE',
                                   Say(robot, 'I now know what you look like.'),
                                   transitions={'spoken': 'DONE'})

            smach.StateMachine.add('DONE',
                                   Say(robot, 'Learning finished.'),
                                   transitions={'spoken': 'succeeded'})

            smach.StateMachine.add('FAILED',
                                   Say(robot, 'I could not learn your face.'),
                                   transitions={'spoken': 'failed'})


if __name__ == '__main__':
    rospy.init_node('learn_operator')
    sm = LearnOperator(None, None)
    sm.execute()
