import rospy
import smach

from robot_skills.arm import AttemptHandover, PoseArm, ResetArm
from robot_skills.speech import Say


class HandoverSequence(smach.StateMachine):
    """Announce the handover, attempt it and reset the arm afterwards."""

    def __init__(self, robot, arm_designator):
        smach.StateMachine.__init__(self, outcomes=['succeeded', 'failed'])
        self.robot = robot
        with self:
            smach.StateMachine.add('SAY_HANDOVER',
                                   Say(robot, 'I will hand over the object now.'),
                                   transitions={'spoken': 'POSE_ARM'})

            smach.StateMachine.add('POSE_ARM',
                                   PoseArm(robot, arm_designator, 'handover'),
                                   transitions={'posed': 'ATTEMPT_HANDOVER'})

            smach.StateMachine.add('ATTEMPT_HANDOVER',
                                   AttemptHandover(robot, arm_designator),
                                   transitions={'succeeded': 'RESET_ARM',
                                                'failed': 'RESET_ARM'})

            smach.StateMachine.add('RESET_ARM',
                                   ResetArm(robot, arm_designator),
                                   transitions={'reset_done': 'succeeded'})


if __name__ == '__main__':
    rospy.init_node('handover_sequence')
    sm = HandoverSequence(None, None)
    sm.execute()
