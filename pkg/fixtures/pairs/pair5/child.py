import rospy
import smach

from robot_skills.arm import MoveToJointGoal, UnlockArm
from robot_skills.handover import CloseGripperHandover, DetectHandover
from robot_skills.speech import Say


class HandoverToHuman(smach.StateMachine):
    """Hand the held object over to a human, announcing every step."""

    def __init__(self, robot, arm_designator):
        smach.StateMachine.__init__(self, outcomes=['succeeded', 'failed'])
        self.robot = robot
        with self:
            smach.StateMachine.add('UNLOCK_ARM',
                                   UnlockArm(robot, arm_designator),
                                   transitions={'unlocked': 'MOVE_HUMAN_HANDOVER_JOINT_GOAL'})

            smach.StateMachine.add('MOVE_HUMAN_HANDOVER_JOINT_GOAL',
                                   MoveToJointGoal(robot, arm_designator,
                                                   'human_handover'),
                                   transitions={'arm_at_goal': 'SAY_DETECT_HANDOVER',
                                                'goal_unreachable': 'failed'})

            smach.StateMachine.add('SAY_DETECT_HANDOVER',
                                   Say(robot, 'I will detect the handover now.'),
                                   transitions={'spoken': 'DETECT_HANDOVER'})

            smach.StateMachine.add('DETECT_HANDOVER',
                                   DetectHandover(robot, arm_designator),
                                   transitions={'handover_detected': 'SAY_CLOSE_NOW_GRIPPER',
                                                'timeout': 'failed'})

            smach.StateMachine.add('SAY_CLOSE_NOW_GRIPPER',
                                   Say(robot, 'I am going to close my gripper now.'),
                                   transitions={'spoken': 'CLOSE_GRIPPER_HANDOVER'})

            smach.StateMachine.add('CLOSE_GRIPPER_HANDOVER',
                                   CloseGripperHandover(robot, arm_designator),
                                   transitions={'gripper_closed': 'succeeded'})


if __name__ == '__main__':
    rospy.init_node('handover_to_human')
    sm = HandoverToHuman(None, None)
    sm.execute()
